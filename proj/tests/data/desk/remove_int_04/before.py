def parse_number(text):
    number = text.split(',')
    number = int(number)
    return len(number)
