"""Tests for core domain model and configuration."""
