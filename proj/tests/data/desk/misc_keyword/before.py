def dump(data):
    text = json.dumps(data)
    return text
