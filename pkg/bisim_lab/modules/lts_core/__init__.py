"""LTS core module"""
