"""AR-ReduNet construction, inference and classification."""
