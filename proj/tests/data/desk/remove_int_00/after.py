def parse_depth(text):
    depth = text.split(',')
    return len(depth)
