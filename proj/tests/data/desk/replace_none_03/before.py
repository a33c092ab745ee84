def check_depth(depth):
    if depth == None:
        return 0
    return depth * 2
