"""t20opt: a T20 tactical decision engine.

Estimates win/defend probabilities for mid-innings match states by Monte
Carlo simulation over phase-specific player profiles, and searches batting
orders (exhaustive, two-pass) and bowling plans (constrained simulated
annealing) to maximize them.
"""

__version__ = "0.1.0"
