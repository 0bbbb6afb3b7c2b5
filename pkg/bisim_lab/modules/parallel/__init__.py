"""Parallel simulation module"""
