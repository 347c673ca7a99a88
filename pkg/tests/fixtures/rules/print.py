print("starting")
print("done")
