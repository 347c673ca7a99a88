names = ["ada", "grace"]
empty = []
