"""
Test suite for fastconv.
"""
