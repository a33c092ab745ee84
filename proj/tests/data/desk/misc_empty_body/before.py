def clean(value):
    if value:
        value = value.decode('utf-8')
    return value
