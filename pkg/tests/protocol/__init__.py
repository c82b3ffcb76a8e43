"""Tests for the flow computation protocol."""
