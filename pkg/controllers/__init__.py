# Controllers module
