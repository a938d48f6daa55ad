name='visualize'
