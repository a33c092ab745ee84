def read_body(response):
    data = to_text(response.read())
    return json.loads(data)
