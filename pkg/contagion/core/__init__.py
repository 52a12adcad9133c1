"""Shared services: configuration, run management, logging, seeding and errors."""
