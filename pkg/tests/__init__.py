"""Tests for Simpleton LLM Service"""
