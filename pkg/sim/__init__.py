# Sim module
