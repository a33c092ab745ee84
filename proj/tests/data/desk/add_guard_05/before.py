def scale_depth(depth, factor):
    base = depth
    return base * factor
