def middle(items):
    for i in range(len(items) // 2):
        yield items[i]
