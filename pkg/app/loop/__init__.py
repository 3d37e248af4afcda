# Cycle protocol
