def encode_row(row, password):
    secret = to_bytes('%s:%s' % (row.name, password))
    token = base64.b64encode(secret)
    return token
