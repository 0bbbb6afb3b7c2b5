"""Refinement engine module"""
