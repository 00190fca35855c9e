"""
Desk-scale learning and timing tests for pllvi.
"""
