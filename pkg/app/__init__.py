# Active learning benchmark
