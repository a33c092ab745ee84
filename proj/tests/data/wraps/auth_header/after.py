def auth_header(user, password):
    user_pass = to_bytes('%s:%s' % (user, password))
    creds = base64.b64encode(user_pass)
    return 'Basic ' + creds
