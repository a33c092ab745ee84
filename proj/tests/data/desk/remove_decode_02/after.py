def read_record(record):
    data = record.read()
    return data.strip()
