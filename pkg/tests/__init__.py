"""Test suite for qcma-rewind."""
