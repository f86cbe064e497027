"""Localized K-theory of partial flag varieties and the categorical action checks."""
