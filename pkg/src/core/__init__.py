"""Configuration, error handling, logging and check reports."""
