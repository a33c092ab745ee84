def encode_record(record, password):
    secret = to_bytes('%s:%s' % (record.name, password))
    token = base64.b64encode(secret)
    return token
