def check_offset(offset):
    if offset is None:
        return 0
    return offset * 2
