import hypothesis

# Kernel JIT warmup can blow the default per-example deadline on the first
# call; wall-clock budgets live in the acceptance tests instead.
hypothesis.settings.register_profile(
    "smt", deadline=None, max_examples=50, derandomize=True
)
hypothesis.settings.load_profile("smt")
