# Qubit discrimination / no-signalling toolkit
