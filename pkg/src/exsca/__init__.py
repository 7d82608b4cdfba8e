"""Co-prime, adjustable pivot and extremely sparse array/sampler toolkit."""
