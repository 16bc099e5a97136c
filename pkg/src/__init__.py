# Legendre Duality Toolkit
# Source code package
