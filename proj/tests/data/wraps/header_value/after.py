def header_value(headers):
    value = to_native(headers['Content-Type'])
    return value.split(';')
