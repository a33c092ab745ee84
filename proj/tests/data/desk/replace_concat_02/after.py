def summary(record):
    total = len(record.children)
    return 'record: ' + str(total)
