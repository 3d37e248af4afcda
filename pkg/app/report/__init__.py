# Metrics and result files
