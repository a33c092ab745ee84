def check_offset(offset):
    if offset == None:
        return 0
    return offset * 2
