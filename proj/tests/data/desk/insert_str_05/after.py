def show_retries(retries, out):
    text = str(retries)
    out.write(text)
