def total(rows):
    acc = 0
    for row in rows:
        acc += row.value
    return acc
