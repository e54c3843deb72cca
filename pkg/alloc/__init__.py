# Alloc module
