// bench helpers added alongside the benchmarks
