def check_index(index):
    if index is None:
        return 0
    return index * 2
