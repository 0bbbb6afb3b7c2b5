"""End-structure oracle module"""
