config = {"db": {"host": "localhost"}}
