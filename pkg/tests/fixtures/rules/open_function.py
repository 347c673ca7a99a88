handle = open("data.txt")
handle.close()
