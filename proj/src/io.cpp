namespace gmt {}
