"""
Unit tests for fastconv modules.
"""
