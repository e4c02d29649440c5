/// Low level data: for each n, (g, cm~, A, markup) in the column order
/// ns+, ns, s+, s. Markup: I italic, B bold, P plain.
pub const LOW_LEVELS: [(u64, [(u64, u64, u64, char); 4]); 64] = [
    (1, [(0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I')]),
    (2, [(0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I')]),
    (3, [(0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I')]),
    (4, [(0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I')]),
    (5, [(0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I'), (0, 0, 1, 'I')]),
    (6, [(0, 0, 1, 'I'), (1, 0, 1, 'I'), (0, 0, 1, 'I'), (1, 0, 1, 'I')]),
    (7, [(0, 0, 1, 'I'), (1, 0, 1, 'I'), (0, 0, 1, 'I'), (1, 0, 1, 'I')]),
    (8, [(0, 0, 1, 'I'), (1, 0, 1, 'I'), (1, 0, 1, 'I'), (3, 0, 1, 'P')]),
    (9, [(0, 0, 1, 'I'), (2, 0, 1, 'P'), (1, 0, 1, 'I'), (4, 0, 1, 'P')]),
    (10, [(0, 0, 1, 'I'), (1, 0, 1, 'I'), (1, 0, 1, 'I'), (7, 0, 2, 'P')]),
    (11, [(1, 0, 1, 'I'), (4, 0, 1, 'P'), (2, 0, 1, 'P'), (6, 0, 2, 'P')]),
    (12, [(0, 0, 1, 'I'), (3, 0, 1, 'P'), (3, 0, 2, 'P'), (13, 0, 3, 'P')]),
    (13, [(3, 0, 1, 'P'), (8, 0, 2, 'P'), (3, 0, 1, 'P'), (8, 0, 2, 'P')]),
    (14, [(0, 0, 1, 'I'), (5, 0, 1, 'P'), (3, 0, 2, 'P'), (17, 0, 3, 'P')]),
    (15, [(1, 0, 1, 'I'), (7, 2, 2, 'P'), (4, 0, 2, 'P'), (19, 2, 4, 'P')]),
    (16, [(2, 0, 1, 'P'), (7, 2, 2, 'P'), (9, 0, 2, 'P'), (21, 2, 4, 'P')]),
    (17, [(6, 0, 2, 'P'), (15, 0, 3, 'P'), (7, 0, 2, 'P'), (17, 0, 3, 'P')]),
    (18, [(0, 0, 1, 'I'), (7, 0, 1, 'P'), (7, 0, 3, 'P'), (37, 0, 6, 'P')]),
    (19, [(8, 0, 2, 'P'), (20, 0, 3, 'P'), (9, 0, 2, 'P'), (22, 0, 4, 'P')]),
    (20, [(2, 0, 1, 'P'), (9, 0, 2, 'P'), (10, 0, 4, 'P'), (43, 0, 7, 'P')]),
    (21, [(1, 0, 2, 'I'), (15, 2, 3, 'P'), (9, 0, 3, 'P'), (41, 2, 6, 'P')]),
    (22, [(1, 0, 1, 'I'), (13, 2, 2, 'P'), (10, 0, 4, 'P'), (49, 2, 7, 'P')]),
    (23, [(13, 0, 3, 'P'), (31, 3, 5, 'P'), (15, 0, 3, 'P'), (35, 3, 5, 'P')]),
    (24, [(1, 0, 1, 'I'), (13, 0, 2, 'P'), (17, 0, 6, 'P'), (73, 0, 11, 'P')]),
    (25, [(14, 0, 3, 'P'), (32, 0, 5, 'P'), (22, 0, 4, 'P'), (48, 0, 7, 'P')]),
    (26, [(3, 0, 2, 'P'), (21, 0, 3, 'P'), (15, 0, 5, 'P'), (71, 0, 10, 'P')]),
    (27, [(12, 0, 3, 'P'), (32, 0, 5, 'P'), (28, 0, 5, 'P'), (64, 0, 9, 'P')]),
    (28, [(4, 0, 2, 'P'), (23, 0, 3, 'P'), (21, 0, 6, 'P'), (89, 0, 12, 'P')]),
    (29, [(24, 0, 4, 'P'), (54, 0, 8, 'P'), (26, 0, 4, 'P'), (58, 0, 8, 'P')]),
    (30, [(1, 0, 2, 'I'), (17, 2, 3, 'P'), (16, 0, 10, 'P'), (145, 6, 19, 'B')]),
    (31, [(28, 0, 5, 'P'), (63, 3, 9, 'P'), (30, 0, 5, 'P'), (67, 3, 9, 'P')]),
    (32, [(14, 2, 3, 'P'), (35, 3, 5, 'P'), (49, 8, 7, 'P'), (105, 18, 14, 'B')]),
    (33, [(7, 2, 3, 'P'), (45, 2, 6, 'P'), (25, 2, 7, 'P'), (109, 2, 14, 'B')]),
    (34, [(6, 0, 3, 'P'), (37, 0, 5, 'P'), (28, 0, 9, 'P'), (127, 0, 17, 'B')]),
    (35, [(13, 0, 4, 'P'), (59, 6, 8, 'P'), (27, 0, 8, 'P'), (117, 6, 15, 'P')]),
    (36, [(5, 0, 2, 'P'), (31, 0, 4, 'P'), (43, 0, 12, 'P'), (181, 0, 23, 'B')]),
    (37, [(43, 0, 6, 'P'), (94, 0, 12, 'P'), (45, 0, 7, 'P'), (98, 0, 13, 'B')]),
    (38, [(8, 0, 3, 'P'), (49, 2, 6, 'P'), (36, 0, 10, 'P'), (161, 2, 20, 'B')]),
    (39, [(13, 0, 5, 'P'), (67, 6, 9, 'P'), (36, 0, 10, 'P'), (155, 6, 20, 'B')]),
    (40, [(10, 0, 3, 'P'), (45, 4, 6, 'P'), (49, 0, 13, 'P'), (205, 12, 26, 'B')]),
    (41, [(54, 0, 8, 'P'), (117, 0, 15, 'B'), (57, 0, 8, 'P'), (123, 0, 16, 'B')]),
    (42, [(1, 0, 3, 'I'), (37, 2, 5, 'P'), (33, 0, 18, 'B'), (289, 6, 36, 'B')]),
    (43, [(60, 0, 8, 'P'), (130, 0, 16, 'B'), (63, 0, 9, 'P'), (136, 0, 17, 'B')]),
    (44, [(13, 0, 4, 'P'), (63, 4, 8, 'P'), (55, 2, 14, 'B'), (229, 8, 28, 'B')]),
    (45, [(17, 0, 5, 'P'), (79, 2, 10, 'P'), (55, 0, 15, 'P'), (235, 14, 29, 'B')]),
    (46, [(13, 0, 5, 'P'), (73, 3, 9, 'P'), (55, 0, 15, 'B'), (241, 9, 29, 'B')]),
    (47, [(73, 0, 10, 'P'), (157, 5, 19, 'B'), (77, 0, 10, 'P'), (165, 5, 20, 'B')]),
    (48, [(9, 4, 4, 'P'), (57, 16, 7, 'P'), (81, 4, 21, 'B'), (337, 20, 41, 'B')]),
    (49, [(69, 0, 10, 'P'), (151, 0, 19, 'B'), (94, 6, 13, 'B'), (201, 12, 25, 'B')]),
    (50, [(14, 0, 5, 'P'), (73, 0, 9, 'P'), (77, 0, 20, 'B'), (331, 0, 40, 'B')]),
    (51, [(25, 5, 8, 'P'), (121, 8, 15, 'B'), (64, 5, 17, 'B'), (271, 8, 33, 'B')]),
    (52, [(21, 0, 6, 'P'), (93, 0, 11, 'P'), (78, 0, 20, 'B'), (323, 0, 39, 'B')]),
    (53, [(96, 0, 13, 'B'), (204, 0, 25, 'B'), (100, 0, 13, 'B'), (212, 0, 26, 'B')]),
    (54, [(12, 0, 5, 'P'), (73, 0, 9, 'P'), (100, 0, 26, 'B'), (433, 0, 52, 'B')]),
    (55, [(38, 0, 10, 'P'), (163, 6, 20, 'B'), (70, 0, 18, 'B'), (295, 6, 35, 'B')]),
    (56, [(21, 0, 6, 'P'), (101, 4, 12, 'B'), (97, 4, 24, 'B'), (401, 12, 48, 'B')]),
    (57, [(31, 5, 9, 'P'), (153, 8, 18, 'B'), (81, 5, 20, 'B'), (341, 8, 40, 'B')]),
    (58, [(24, 0, 8, 'P'), (121, 0, 15, 'B'), (91, 0, 23, 'B'), (391, 0, 46, 'B')]),
    (59, [(121, 3, 15, 'B'), (256, 3, 30, 'B'), (126, 3, 16, 'B'), (266, 3, 31, 'B')]),
    (60, [(7, 0, 5, 'P'), (73, 4, 9, 'P'), (79, 0, 38, 'B'), (649, 12, 76, 'B')]),
    (61, [(131, 0, 17, 'B'), (276, 0, 33, 'B'), (135, 0, 17, 'B'), (284, 0, 34, 'B')]),
    (62, [(28, 0, 9, 'P'), (141, 3, 17, 'B'), (105, 0, 27, 'B'), (449, 9, 53, 'B')]),
    (63, [(35, 0, 10, 'P'), (171, 10, 20, 'B'), (109, 0, 27, 'B'), (457, 14, 53, 'B')]),
    (64, [(70, 6, 9, 'P'), (155, 14, 18, 'B'), (225, 30, 27, 'B'), (465, 62, 54, 'B')]),
];
