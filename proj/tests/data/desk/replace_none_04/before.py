def check_index(index):
    if index == None:
        return 0
    return index * 2
