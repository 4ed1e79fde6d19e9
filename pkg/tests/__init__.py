"""
alabama tests
"""
