"""Command implementations: resolve inputs, call the numerical core, write outputs."""
