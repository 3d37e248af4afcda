# Learner adapters
