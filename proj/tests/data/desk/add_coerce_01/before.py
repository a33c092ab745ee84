def join_record(record, sep):
    parts = record.parts
    return sep.join(parts)
