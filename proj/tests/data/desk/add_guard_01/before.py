def scale_limit(limit, factor):
    base = limit
    return base * factor
