def load(path):
    try:
        return int(open(path).read())
    except ValueError:
        return 0
