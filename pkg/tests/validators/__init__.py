"""Tests for validators package."""
