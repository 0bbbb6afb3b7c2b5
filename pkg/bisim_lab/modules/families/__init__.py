"""Families module"""
