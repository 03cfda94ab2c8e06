"""Exact convex-geometry toolkit for covariograms of polytopes."""
