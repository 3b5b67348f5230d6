# Make utils a package
