"""Storage package - LTSP codec and report writers"""
