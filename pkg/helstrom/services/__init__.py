# Qubit discrimination services
