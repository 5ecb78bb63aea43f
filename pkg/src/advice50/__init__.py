"""Extended quantum oracle algorithms with an explicit oracle's-choice register,
sum-over-histories checks, and classical query-complexity analysis."""

__version__ = "0.1.0"
