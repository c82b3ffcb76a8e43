"""Tests for atomic execution."""
