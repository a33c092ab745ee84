def header_value(headers):
    value = headers['Content-Type']
    return value.split(';')
