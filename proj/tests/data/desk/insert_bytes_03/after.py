def encode_request(request, password):
    secret = to_bytes('%s:%s' % (request.name, password))
    token = base64.b64encode(secret)
    return token
