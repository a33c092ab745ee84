def check_width(width):
    if width == None:
        return 0
    return width * 2
