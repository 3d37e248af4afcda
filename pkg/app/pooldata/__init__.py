# Datasets, generators and pool bookkeeping
