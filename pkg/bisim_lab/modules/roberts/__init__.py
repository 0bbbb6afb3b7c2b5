"""Roberts module"""
