# Phy module
