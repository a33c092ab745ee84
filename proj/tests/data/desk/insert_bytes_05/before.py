def encode_row(row, password):
    secret = '%s:%s' % (row.name, password)
    token = base64.b64encode(secret)
    return token
