def parse_index(text):
    index = text.split(',')
    index = int(index)
    return len(index)
