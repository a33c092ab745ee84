def read_count(path):
    with open(path) as fh:
        data = fh.read()
        return data + 1
