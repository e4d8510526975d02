"""IO helpers."""