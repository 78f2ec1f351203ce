# Qubit discrimination models
