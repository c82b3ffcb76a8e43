"""Tests for the transaction aggregation simulator."""
