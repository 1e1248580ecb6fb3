"""Persistence of states, tables and reports."""
