"""Tests for k3-quotients."""
