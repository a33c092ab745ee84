def check_level(level):
    if level == None:
        return 0
    return level * 2
