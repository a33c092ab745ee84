def read_record(record):
    data = record.read()
    data = data.decode('utf-8')
    return data.strip()
