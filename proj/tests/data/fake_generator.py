#!/usr/bin/env python3
# Scripted query generator speaking the NDJSON protocol.
#   fake_generator.py suffix        -> "<query> gen<n>", n counting requests
#   fake_generator.py echo          -> the request query unchanged
#   fake_generator.py list A B ...  -> A, B, ... in turn, then "<query> tail"
#   fake_generator.py garbage       -> a line that is not JSON
#   fake_generator.py die           -> exit without answering
import json
import sys

mode = sys.argv[1] if len(sys.argv) > 1 else "suffix"
scripted = sys.argv[2:]
count = 0
for line in sys.stdin:
    request = json.loads(line)
    count += 1
    if mode == "die":
        sys.exit(3)
    if mode == "garbage":
        sys.stdout.write("not json\n")
        sys.stdout.flush()
        continue
    if mode == "echo":
        out = request["query"]
    elif mode == "list":
        out = scripted.pop(0) if scripted else request["query"] + " tail"
    else:
        out = "%s gen%d" % (request["query"], count)
    sys.stdout.write(json.dumps({"query": out}) + "\n")
    sys.stdout.flush()
