"""
Integration tests for fastconv.
Run small presets end to end and inspect the report directories they write.
"""
