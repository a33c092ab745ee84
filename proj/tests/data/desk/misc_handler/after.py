def load(path):
    try:
        return int(open(path).read())
    except (ValueError, TypeError):
        return 0
