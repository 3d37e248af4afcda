# Query strategies
