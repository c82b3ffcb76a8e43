"""Tests for the aggregation oracles."""
