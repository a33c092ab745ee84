def show_total(total, out):
    text = str(total)
    out.write(text)
