#!/usr/bin/env python3
# Copyright (c) 2026 The momentkit Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes messy_outputs.jsonl: free-form model answers with hand labels.

Each row carries the mode it is parsed in, whether a parser is expected to
recover it, and the ground truth used for the exclusion recomputation.
"""
import json
import random
import sys

G = "grounding"
D = "dense"

# (raw text, expected span or None)
GROUNDING = [
    ("From 12 to 40.", (12, 40)),
    ("from 03 to 57", (3, 57)),
    ("The event happens from 20 to 35.", (20, 35)),
    ("It can be seen from frame 15 to frame 48 in the video.", (15, 48)),
    ("From 8 to 33.", (8, 33)),
    ("The man opens the door from 44 to 71, then leaves.", (44, 71)),
    ("Between frames 10 - 25.", (10, 25)),
    ("Frames 30-62.", (30, 62)),
    ("It happens at 5 to 19.", (5, 19)),
    ("This occurs from 60 to 20.", (20, 60)),
    ("from 90 to 130", (90, 99)),
    ("The activity takes place from the 22 to the 50 frame.", (22, 50)),
    ("We observe it FROM 00 TO 99.", (0, 99)),
    ("Answer: 41 ~ 77", (41, 77)),
    ("From 34 to 34.", (34, 34)),
    ("The clip shows this from 71 to 88. Afterwards the camera pans.", (71, 88)),
    ("Sure! From 09 to 26.", (9, 26)),
    ("The relevant frames are 55 to 80.", (55, 80)),
    ("It starts from about 12 and goes to 39.", (12, 39)),
    ("I'm sorry, I cannot determine when that happens.", None),
    ("The woman smiles at the beginning of the video.", None),
    ("It happens between frame twelve and frame forty.", None),
    ("Throughout the whole video.", None),
    ("Near the end.", None),
    ("At 0.5 seconds into the clip.", None),
    ("The event occurs from 18 to 45 in the video.", (18, 45)),
    ("from 1 to 7", (1, 7)),
    ("From 47 to 93.", (47, 93)),
    ("between 25 and 60", None),
    ("It is visible from frame 33 to 66.", (33, 66)),
    ("I think 14-29.", (14, 29)),
    ("From 65 to 95.", (65, 95)),
    ("The dog is seen from 02 to 11 and again later.", (2, 11)),
    ("Right after the intro.", None),
    ("From 50 to 52.", (50, 52)),
    ("The segment from 27 to 31 shows it.", (27, 31)),
    ("Frames 76 – 98.", (76, 98)),
    ("It is not shown in the video.", None),
    ("From 36 to 58.", (36, 58)),
    ("from 04 to 28.", (4, 28)),
    ("The person jumps from 61 to 64.", (61, 64)),
    ("No.", None),
    ("From 19 to 83.", (19, 83)),
    ("It takes place from 40 to 44 in this video.", (40, 44)),
    ("The action begins shortly after the start and ends mid-way.", None),
    ("From 70 to 74.", (70, 74)),
    ("from 13 to 21", (13, 21)),
    ("During frames 29 to 37.", (29, 37)),
    ("The cat sleeps.", None),
    ("From 86 to 97.", (86, 97)),
]

# (raw text, expected list of (s, e, caption) or None)
DENSE = [
    ("A man opens the door, from 00 to 20. He walks into the kitchen, from 21 to 60. He cooks breakfast, from 61 to 99.",
     [(0, 20, "A man opens the door"), (21, 60, "He walks into the kitchen"), (61, 99, "He cooks breakfast")]),
    ('[{"event": "a dog runs in the park", "timestamps": "from 05 to 30"}, {"event": "the dog catches a ball", "timestamps": "from 31 to 70"}]',
     [(5, 30, "a dog runs in the park"), (31, 70, "the dog catches a ball")]),
    ("{'event': 'a woman paints a wall', 'timestamps': 'from 10 to 45'}, {'event': 'she cleans the brush', 'timestamps': 'from 46 to 80'}",
     [(10, 45, "a woman paints a wall"), (46, 80, "she cleans the brush")]),
    ("1. From 00 to 15: a boy rides a bike.\n2. From 16 to 50: he falls down.\n3. From 51 to 99: his friend helps him.",
     [(0, 15, "a boy rides a bike"), (16, 50, "he falls down"), (51, 99, "his friend helps him")]),
    ("The video shows a man playing guitar on a street.", None),
    ("Sure! Here is the output:\n```json\n[{\"event\": \"people dance\", \"timestamps\": \"from 02 to 40\"}]\n```",
     [(2, 40, "people dance")]),
    ("- from 05 to 25: a chef chops onions\n- from 26 to 60: he fries them in a pan",
     [(5, 25, "a chef chops onions"), (26, 60, "he fries them in a pan")]),
    ("Two people talk, from 00 to 50. Then they shake hands, from 51 to 99.",
     [(0, 50, "Two people talk"), (51, 99, "Then they shake hands")]),
    ("First a car drives by, then a bus stops at the station.", None),
    ('{"events": [{"event": "a girl reads", "timestamps": "from 10 to 40"}]}', [(10, 40, "a girl reads")]),
    ("A cat jumps on the table, from 30 to 12.", [(12, 30, "A cat jumps on the table")]),
    ("The man lifts weights, from 00 to 120.", [(0, 99, "The man lifts weights")]),
    ("I cannot describe the video in detail.", None),
    ("{'event': 'kids play soccer', 'timestamps': 'from 00 to 99'}", [(0, 99, "kids play soccer")]),
    ("1) from 10 to 20, someone knocks\n2) from 21 to 35, the door opens",
     [(10, 20, "someone knocks"), (21, 35, "the door opens")]),
    ("Events: people gather; a speech is given; everyone claps.", None),
    ("A woman waters plants, from 03 to 33. She trims a bush, from 34 to 66. She sweeps the path, from 67 to 98.",
     [(3, 33, "A woman waters plants"), (34, 66, "She trims a bush"), (67, 98, "She sweeps the path")]),
    ('[{"timestamps": "from 15 to 45", "event": "a band plays"}]', [(15, 45, "a band plays")]),
    ("The video is about cooking.", None),
    ("{\"event\": \"a skier descends\", \"timestamps\": \"from 00 to 60\"}, {\"event\": \"he stops\", \"timestamps\": \"from 61 to 70\"",
     [(0, 60, "a skier descends"), (61, 70, "he stops")]),
    ("Someone mows the lawn, from 00 to 99.", [(0, 99, "Someone mows the lawn")]),
    ("At first the man is sitting and later he stands up.", None),
    ("from 20 to 40: a man ties his shoes\nfrom 41 to 80: he starts running",
     [(20, 40, "a man ties his shoes"), (41, 80, "he starts running")]),
    ('[{"event": "", "timestamps": "from 10 to 20"}]', None),
    ("A baby laughs, from 05 to 15.", [(5, 15, "A baby laughs")]),
    ("{'event': 'a horse gallops', 'timestamp': 'from 12 to 48'}", [(12, 48, "a horse gallops")]),
    ("There are several events in this video but I am not sure about the times.", None),
    ("A boy throws a ball, from 10 to 30. A dog fetches it, from 31 to 55.",
     [(10, 30, "A boy throws a ball"), (31, 55, "A dog fetches it")]),
    ("Output: [{\"event\": \"the crowd cheers\", \"timestamps\": \"from 70 to 99\"}]", [(70, 99, "the crowd cheers")]),
    ("The man, wearing a hat, sings, from 00 to 45.", [(0, 45, "The man, wearing a hat, sings")]),
    ("Nothing much happens.", None),
    ("* from 00 to 10: title card appears\n* from 11 to 90: interview\n* from 91 to 99: credits",
     [(0, 10, "title card appears"), (11, 90, "interview"), (91, 99, "credits")]),
    ("A person cuts paper, from 08 to 38. They fold it, from 39 to 77.",
     [(8, 38, "A person cuts paper"), (39, 77, "They fold it")]),
    ("{event: a bird flies, timestamps: from 10 to 20}", None),
    ("A chef plates food, from 40 to 90.", [(40, 90, "A chef plates food")]),
    ('[{"event": "a kid swims", "timestamps": "from 10 to 50"}, {"event": "he climbs out", "timestamps": "from 51 to 60"}]',
     [(10, 50, "a kid swims"), (51, 60, "he climbs out")]),
    ("The video starts with a man and ends with a woman.", None),
    ("Players warm up, from 00 to 25. The match begins, from 26 to 99.",
     [(0, 25, "Players warm up"), (26, 99, "The match begins")]),
    ("2. From 30 to 60: the man paints the fence.", [(30, 60, "the man paints the fence")]),
    ("I don't know.", None),
    ("A girl brushes a horse, from 15 to 65.", [(15, 65, "A girl brushes a horse")]),
    ("{'event': 'cars race', 'timestamps': 'from 00 to 80'}, {'event': 'one car crashes', 'timestamps': 'from 81 to 90'}",
     [(0, 80, "cars race"), (81, 90, "one car crashes")]),
    ("Timestamps are unavailable for this clip.", None),
    ("A man fixes a sink, from 02 to 72. He washes his hands, from 73 to 95.",
     [(2, 72, "A man fixes a sink"), (73, 95, "He washes his hands")]),
    ("A crowd walks, from 10 to 30.", [(10, 30, "A crowd walks")]),
    ("from 05 to 55 - a woman does yoga", [(5, 55, "a woman does yoga")]),
    ("Someone is cooking something in the kitchen.", None),
    ('[{"event": "a surfer rides a wave", "timestamps": "from 20 to 60"}]', [(20, 60, "a surfer rides a wave")]),
    ("The boy draws, from 00 to 33. The girl paints, from 34 to 66. They show their art, from 67 to 99.",
     [(0, 33, "The boy draws"), (34, 66, "The girl paints"), (67, 99, "They show their art")]),
    ("A man sings and dances.", None),
]


def main(path):
    rng = random.Random(7)
    rows = []
    for i, (text, span) in enumerate(GROUNDING):
        # ground truth near the expected answer so IoU varies
        if span:
            s, e = span
        else:
            s = rng.randint(0, 60)
            e = s + rng.randint(5, 39)
        gs = max(0, min(99, s + rng.randint(-6, 6)))
        ge = max(gs, min(99, e + rng.randint(-6, 6)))
        row = {"video_id": "mg%03d" % i, "query_id": "e0:qt1", "mode": G, "raw_text": text,
               "expect_parsed": span is not None, "gt": {"start": gs, "end": ge}}
        if span:
            row["expect"] = [{"start": span[0], "end": span[1]}]
        rows.append(row)
    for i, (text, items) in enumerate(DENSE):
        row = {"video_id": "md%03d" % i, "query_id": "dense:qd1", "mode": D, "raw_text": text,
               "expect_parsed": items is not None}
        if items:
            row["expect"] = [{"start": s, "end": e, "caption": c} for s, e, c in items]
        rows.append(row)
    assert len(rows) == 100
    with open(path, "w") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    print("parseable:", sum(r["expect_parsed"] for r in rows), "of", len(rows))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "messy_outputs.jsonl")
